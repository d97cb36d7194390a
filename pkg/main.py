from confocal_diagrams.cli import main


if __name__ == "__main__":
    main()
